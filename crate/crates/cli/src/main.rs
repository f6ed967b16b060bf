//! `invseq` command-line front end.
//!
//! Output goes to stdout in the format chosen with `--format`. Failures print a
//! JSON object `{"error", "kind", "message"}` on stderr and exit with status 1,
//! or status 2 when a resource guard stopped the computation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use invseq::extensions::{
    ascent_minimal_set_with, construct_decreasing_ascent, rgf_minimal_set, AscentOptions,
    FamilyMinimalSet, RecordProfile, DEFAULT_MAX_ASCENT_LEN,
};
use invseq::generate::construct::{construct_near_max, construct_prefix_family, construct_tight_ub};
use invseq::generate::{
    isbt_table_with, minimal_set_naive_with, minimal_set_with, GenOptions, IsbtDisplay, MinimalSet,
    DEFAULT_MAX_MDD,
};
use invseq::minimality::{is_minimal_oracle_with_limit, Witness, DEFAULT_ORACLE_MAX_LEN};
use invseq::series::{count_table_with_order, CountKind, CountTable, DEFAULT_MAX_SERIES_ORDER};
use invseq::trees::{
    coloured_to_minimal, count_a_enum, ip_counts_by_max, minimal_to_coloured, phi, phi_coloured,
    phi_coloured_inverse, phi_inverse, ColouredInvSeq, IncTree,
};
use invseq::{contains, is_minimal_prop1, occurrences, Execution, IntSeq, SeqClassFlags};

#[derive(Parser)]
#[command(name = "invseq", version, about = "Minimal pattern-containing inversion sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads; 1 runs everything on the calling thread.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Longest host accepted by the subsequence oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_MAX_LEN)]
    max_oracle_len: usize,

    /// Largest pattern mdd the generators accept.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_MDD)]
    max_mdd: u32,

    /// Highest series order `count --engine series` may expand to.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SERIES_ORDER)]
    series_order: usize,

    /// Replace a pattern that is not a Cayley permutation by its reduction.
    #[arg(long, global = true)]
    auto_reduce: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenEngine {
    Pruned,
    Naive,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckEngine {
    Prop1,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    Prefix,
    TightUb,
    NearMax,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountArg {
    #[value(name = "A")]
    A,
    #[value(name = "T")]
    T,
    #[value(name = "IP")]
    Ip,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountEngine {
    Enum,
    Series,
}

#[derive(Subcommand)]
enum Command {
    /// mdd, dist, saturated positions, records, ascents and class flags.
    Stats { seq: IntSeq },
    /// Order-isomorphic Cayley permutation.
    Reduce { seq: IntSeq },
    /// Pattern containment, optionally listing every occurrence.
    Contains {
        pattern: IntSeq,
        seq: IntSeq,
        #[arg(long)]
        occurrences: bool,
    },
    /// All minimal inversion sequences containing PATTERN.
    Minimal {
        pattern: IntSeq,
        #[arg(long, value_enum, default_value_t = GenEngine::Pruned)]
        engine: GenEngine,
    },
    /// Decide whether SEQ is a minimal PATTERN-containing inversion sequence.
    MinimalCheck {
        pattern: IntSeq,
        seq: IntSeq,
        #[arg(long, value_enum, default_value_t = CheckEngine::Prop1)]
        engine: CheckEngine,
    },
    /// Basis-type vector of one pattern.
    Isbt { pattern: IntSeq },
    /// Patterns of length up to K grouped by basis type.
    IsbtTable {
        #[arg(long)]
        max_len: usize,
    },
    /// Closed-form minimal sequences.
    Construct {
        pattern: IntSeq,
        #[arg(long, value_enum)]
        kind: ConstructKind,
    },
    /// Count tables for coloured sequences (A), bi-labelled trees (T) or I_n ∩ P_n (IP).
    Count {
        #[arg(long, value_enum)]
        kind: CountArg,
        #[arg(long)]
        limit: usize,
        #[arg(long, value_enum, default_value_t = CountEngine::Series)]
        engine: CountEngine,
    },
    /// Increasing tree of an inversion sequence.
    Phi {
        seq: IntSeq,
        /// One b/r letter per value of [0, n-1].
        #[arg(long)]
        colours: Option<String>,
    },
    /// Inversion sequence of a tree given as JSON; `-` reads stdin.
    PhiInverse { treefile: String },
    /// Coloured-prefix bijection, forward (--coloured) or backward (--minimal).
    #[command(group(ArgGroup::new("direction").required(true).args(["coloured", "minimal"])))]
    Bijection {
        pattern: IntSeq,
        #[arg(long)]
        coloured: Option<ColouredInvSeq>,
        #[arg(long)]
        minimal: Option<IntSeq>,
    },
    /// Minimal restricted growth functions containing PATTERN.
    RgfMinimal { pattern: IntSeq },
    /// Minimal Cayley ascent sequences containing PATTERN, up to a length bound.
    AscentMinimal {
        pattern: IntSeq,
        #[arg(long)]
        max_len: usize,
    },
    /// Long minimal ascent sequence for the decreasing pattern of length K.
    AscentConstruct { k: usize },
}

enum CliError {
    Lib(invseq::Error),
    Usage(String),
}

impl From<invseq::Error> for CliError {
    fn from(e: invseq::Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

struct Ctx {
    format: Format,
    exec: Execution,
    opts: GenOptions,
    max_oracle_len: usize,
    series_order: usize,
    auto_reduce: bool,
}

impl Ctx {
    fn pattern(&self, p: IntSeq) -> IntSeq {
        if self.auto_reduce {
            p.reduce()
        } else {
            p
        }
    }

    /// Renders `value` as JSON, or uses the text/CSV renderers.
    fn emit<T: Serialize>(
        &self,
        value: &T,
        text: impl FnOnce() -> String,
        csv: Option<&dyn Fn() -> String>,
    ) -> CliResult<String> {
        match self.format {
            Format::Json => Ok(serde_json::to_string_pretty(value).expect("serializable") + "\n"),
            Format::Text => Ok(text()),
            Format::Csv => match csv {
                Some(f) => Ok(f()),
                None => Err(CliError::Usage("this subcommand has no CSV form".into())),
            },
        }
    }
}

fn lines<'a>(items: impl IntoIterator<Item = &'a IntSeq>) -> String {
    items.into_iter().map(|s| format!("{s}\n")).collect()
}

fn length_csv<'a>(items: impl IntoIterator<Item = &'a IntSeq>) -> String {
    let mut out = String::from("length,sequence\n");
    for s in items {
        let _ = writeln!(out, "{},{s}", s.len());
    }
    out
}

fn describe_witness(w: &Witness) -> String {
    match w {
        Witness::Occurrence { occurrence, condition } => {
            let pos: Vec<String> = occurrence.positions.iter().map(usize::to_string).collect();
            format!("occurrence at positions {} breaks condition {condition}", pos.join(" "))
        }
        Witness::Smaller { sequence, deleted } => {
            let pos: Vec<String> = deleted.iter().map(usize::to_string).collect();
            format!("deleting positions {} leaves {sequence}", pos.join(" "))
        }
    }
}

fn family_text(set: &FamilyMinimalSet) -> String {
    let mut out = String::new();
    let _ = write!(out, "pattern {}", set.pattern);
    if let Some(t) = set.truncated_at {
        let _ = write!(out, "  up to length {t}");
    }
    out.push('\n');
    for (len, count) in &set.lengths {
        let _ = writeln!(out, "length {len}: {count}");
    }
    out + &lines(&set.sequences)
}

fn minimal_text(set: &MinimalSet) -> String {
    format!(
        "pattern {}  mdd {}  isbt {}\n{}",
        set.pattern,
        set.mdd,
        IsbtDisplay(&set.isbt),
        lines(&set.sequences)
    )
}

fn enum_count_table(kind: CountKind, limit: usize, exec: Execution) -> CliResult<CountTable> {
    let mut by_len: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    let mut ip_by_len = |len: usize| -> CliResult<Vec<u64>> {
        if let Some(v) = by_len.get(&len) {
            return Ok(v.clone());
        }
        let v = ip_counts_by_max(len)?;
        by_len.insert(len, v.clone());
        Ok(v)
    };
    let (rows, cols, counts): (Vec<usize>, Vec<usize>, Vec<Vec<BigUint>>) = match kind {
        CountKind::A => {
            let labels: Vec<usize> = (0..=limit).collect();
            let mut counts = Vec::new();
            for &n in &labels {
                let row = labels
                    .iter()
                    .map(|&m| count_a_enum(n, m, exec).map(BigUint::from))
                    .collect::<invseq::Result<Vec<_>>>()?;
                counts.push(row);
            }
            (labels.clone(), labels, counts)
        }
        CountKind::T => {
            let labels: Vec<usize> = (1..=limit).collect();
            let mut counts = Vec::new();
            for &n in &labels {
                let mut row = Vec::new();
                for &k in &labels {
                    row.push(BigUint::from(ip_by_len(n + k - 1)?[n - 1]));
                }
                counts.push(row);
            }
            (labels.clone(), labels, counts)
        }
        CountKind::IP => {
            let labels: Vec<usize> = (1..=limit).collect();
            let mut row = Vec::new();
            for &n in &labels {
                row.push(BigUint::from(ip_by_len(n)?.iter().sum::<u64>()));
            }
            (vec![0], labels, vec![row])
        }
    };
    Ok(CountTable {
        kind,
        row_labels: rows,
        col_labels: cols,
        counts,
    })
}

fn read_tree(path: &str) -> CliResult<IncTree> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?
    };
    let raw: IncTree =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    // re-validate, deserialization alone does not check the tree shape
    Ok(IncTree::new(
        (0..raw.len()).map(|v| raw.parent(v)).collect(),
        raw.colours().map(<[_]>::to_vec),
    )?)
}

fn run(cli: Cli) -> CliResult<String> {
    let exec = match cli.threads {
        Some(1) => Execution::Sequential,
        _ => Execution::Parallel,
    };
    let ctx = Ctx {
        format: cli.format,
        exec,
        opts: GenOptions {
            exec,
            max_mdd: cli.max_mdd,
            ..GenOptions::default()
        },
        max_oracle_len: cli.max_oracle_len,
        series_order: cli.series_order,
        auto_reduce: cli.auto_reduce,
    };

    match cli.command {
        Command::Stats { seq } => {
            let profile = RecordProfile::of(&seq);
            let value = json!({
                "sequence": seq,
                "length": seq.len(),
                "mdd": seq.mdd().ok(),
                "dist": seq.dist(),
                "sat": seq.sat().ok(),
                "rec_values": profile.rec_values,
                "asc_count": profile.asc_count,
                "flags": SeqClassFlags::of(&seq),
            });
            ctx.emit(&value, || {
                let f = SeqClassFlags::of(&seq);
                let opt = |v: &serde_json::Value| match v {
                    serde_json::Value::Null => "undefined".to_string(),
                    other => other.to_string(),
                };
                format!(
                    "sequence {seq}\nlength {}\nmdd {}\ndist {}\nsat {}\nrecords {:?}\nascents {}\n\
                     inversion sequence {}\ncayley permutation {}\nrgf {}\nascent sequence {}\n",
                    seq.len(),
                    opt(&value["mdd"]),
                    seq.dist(),
                    opt(&value["sat"]),
                    profile.rec_values,
                    profile.asc_count,
                    f.is_inversion_sequence,
                    f.is_cayley_permutation,
                    f.is_rgf,
                    f.is_ascent_sequence,
                )
            }, None)
        }
        Command::Reduce { seq } => {
            let reduced = seq.reduce();
            ctx.emit(&json!({ "input": seq, "reduced": reduced }), || format!("{reduced}\n"), None)
        }
        Command::Contains { pattern, seq, occurrences: list } => {
            let pattern = ctx.pattern(pattern);
            let found = contains(&seq, &pattern)?;
            if !list {
                return ctx.emit(&json!({ "contains": found }), || format!("{found}\n"), None);
            }
            let occ = occurrences(&seq, &pattern)?;
            let pos: Vec<&Vec<usize>> = occ.iter().map(|o| &o.positions).collect();
            ctx.emit(
                &json!({ "contains": found, "occurrences": pos }),
                || {
                    let mut out = format!("{found}\n");
                    for p in &pos {
                        let cells: Vec<String> = p.iter().map(usize::to_string).collect();
                        let _ = writeln!(out, "{}", cells.join(" "));
                    }
                    out
                },
                Some(&|| {
                    let mut out = String::from("occurrence,positions\n");
                    for (i, p) in pos.iter().enumerate() {
                        let cells: Vec<String> = p.iter().map(usize::to_string).collect();
                        let _ = writeln!(out, "{},{}", i + 1, cells.join(" "));
                    }
                    out
                }),
            )
        }
        Command::Minimal { pattern, engine } => {
            let pattern = ctx.pattern(pattern);
            let set = match engine {
                GenEngine::Pruned => minimal_set_with(&pattern, &ctx.opts)?,
                GenEngine::Naive => minimal_set_naive_with(&pattern, &ctx.opts)?,
            };
            ctx.emit(&set, || minimal_text(&set), Some(&|| length_csv(&set.sequences)))
        }
        Command::MinimalCheck { pattern, seq, engine } => {
            let pattern = ctx.pattern(pattern);
            let verdict = match engine {
                CheckEngine::Prop1 => is_minimal_prop1(&seq, &pattern)?,
                CheckEngine::Oracle => is_minimal_oracle_with_limit(&seq, &pattern, ctx.max_oracle_len)?,
            };
            ctx.emit(&verdict, || match &verdict.witness {
                None => "minimal\n".to_string(),
                Some(w) => format!("not minimal: {}\n", describe_witness(w)),
            }, None)
        }
        Command::Isbt { pattern } => {
            let pattern = ctx.pattern(pattern);
            let set = minimal_set_with(&pattern, &ctx.opts)?;
            ctx.emit(
                &json!({ "pattern": pattern, "isbt": set.isbt }),
                || format!("{}\n", IsbtDisplay(&set.isbt)),
                None,
            )
        }
        Command::IsbtTable { max_len } => {
            let (table, _) = isbt_table_with(max_len, &ctx.opts)?;
            ctx.emit(&table, || table.to_text(), Some(&|| {
                let mut out = String::from("isbt,pattern\n");
                for row in &table.rows {
                    for p in &row.patterns {
                        let _ = writeln!(out, "\"{}\",{p}", IsbtDisplay(&row.isbt));
                    }
                }
                out
            }))
        }
        Command::Construct { pattern, kind } => {
            let pattern = ctx.pattern(pattern);
            let (name, seqs) = match kind {
                ConstructKind::Prefix => ("prefix", construct_prefix_family(&pattern)?),
                ConstructKind::TightUb => ("tight-ub", vec![construct_tight_ub(&pattern)?]),
                ConstructKind::NearMax => ("near-max", vec![construct_near_max(&pattern)?]),
            };
            ctx.emit(
                &json!({ "pattern": pattern, "kind": name, "sequences": seqs }),
                || lines(&seqs),
                Some(&|| length_csv(&seqs)),
            )
        }
        Command::Count { kind, limit, engine } => {
            let kind = match kind {
                CountArg::A => CountKind::A,
                CountArg::T => CountKind::T,
                CountArg::Ip => CountKind::IP,
            };
            if limit == 0 && kind != CountKind::A {
                return Err(CliError::Usage("limit must be at least 1".into()));
            }
            let table = match engine {
                CountEngine::Series => count_table_with_order(kind, limit, ctx.series_order)?,
                CountEngine::Enum => enum_count_table(kind, limit, ctx.exec)?,
            };
            ctx.emit(&table, || table.to_text(), Some(&|| table.to_csv()))
        }
        Command::Phi { seq, colours } => {
            let tree = match colours {
                None => phi(&seq)?,
                Some(c) => phi_coloured(&format!("{seq}:{c}").parse::<ColouredInvSeq>()?),
            };
            ctx.emit(&tree, || format!("{}\n", tree.to_newick()), None)
        }
        Command::PhiInverse { treefile } => {
            let tree = read_tree(&treefile)?;
            let text = match tree.colours() {
                Some(_) => phi_coloured_inverse(&tree)?.to_string(),
                None => phi_inverse(&tree)?.to_string(),
            };
            ctx.emit(&json!({ "sequence": text }), || format!("{text}\n"), None)
        }
        Command::Bijection { pattern, coloured, minimal } => {
            let pattern = ctx.pattern(pattern);
            let (alpha, sigma) = match (coloured, minimal) {
                (Some(alpha), _) => {
                    let sigma = coloured_to_minimal(&alpha, &pattern)?;
                    (alpha, sigma)
                }
                (None, Some(sigma)) => (minimal_to_coloured(&sigma, &pattern)?, sigma),
                (None, None) => unreachable!("clap requires one direction"),
            };
            ctx.emit(
                &json!({ "pattern": pattern, "coloured": alpha, "minimal": sigma }),
                || format!("{alpha} -> {sigma}\n"),
                None,
            )
        }
        Command::RgfMinimal { pattern } => {
            let set = rgf_minimal_set(&ctx.pattern(pattern))?;
            ctx.emit(&set, || family_text(&set), Some(&|| length_csv(&set.sequences)))
        }
        Command::AscentMinimal { pattern, max_len } => {
            let opts = AscentOptions {
                exec: ctx.exec,
                max_len_limit: DEFAULT_MAX_ASCENT_LEN,
            };
            let set = ascent_minimal_set_with(&ctx.pattern(pattern), max_len, &opts)?;
            ctx.emit(&set, || family_text(&set), Some(&|| length_csv(&set.sequences)))
        }
        Command::AscentConstruct { k } => {
            let seq = construct_decreasing_ascent(k)?;
            ctx.emit(
                &json!({ "k": k, "length": seq.len(), "sequence": seq }),
                || format!("{seq}\n"),
                None,
            )
        }
    }
}

fn fail(kind: &str, message: String, code: u8) -> ExitCode {
    let body = json!({ "error": true, "kind": kind, "message": message });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim_end().to_string(), 1),
    };

    #[cfg(feature = "parallel")]
    if let Some(n) = cli.threads.filter(|&n| n > 1) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail("usage", format!("cannot start {n} threads: {e}"), 1);
        }
    }

    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => fail("usage", msg, 1),
        Err(CliError::Lib(e)) => {
            let code = if e.is_guard() { 2 } else { 1 };
            fail(e.kind(), e.to_string(), code)
        }
    }
}
