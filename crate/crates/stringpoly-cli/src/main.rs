//! Command-line front end: per-word queries, batch classification, and the
//! rank-4 classification table.

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;

use stringpoly::moves::{self, DeltaSequence};
use stringpoly::polytope::{self, Coords, WeightVector};
use stringpoly::potential;
use stringpoly::resolution;
use stringpoly::weyl::{self, ReducedWord};
use stringpoly::wiring::{enumerate_rigorous_paths, Bullet, WiringDiagram};

#[derive(Parser)]
#[command(name = "stringpoly", version, about = "String polytopes, wiring diagrams, and small toric resolutions")]
struct Cli {
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Aligned text output instead of JSON where supported.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rigorous paths of a word with both inequality vectors.
    Paths {
        #[arg(long)]
        word: String,
    },
    /// String polytope H-representation, optionally with vertices.
    Polytope {
        #[arg(long)]
        word: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "m")]
        coords: String,
        #[arg(long)]
        vertices: bool,
    },
    /// Delta-index of a word for a given sequence.
    Index {
        #[arg(long)]
        word: String,
        #[arg(long)]
        delta: String,
    },
    /// Small-index witness of a word.
    Small {
        #[arg(long)]
        word: String,
    },
    /// Bott data of a word (the [v | w] column matrix).
    Bott {
        #[arg(long)]
        word: String,
    },
    /// End-to-end small-toric-resolution verdict.
    Resolve {
        #[arg(long)]
        word: String,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Disk potential of a small-index word.
    Potential {
        #[arg(long)]
        word: String,
    },
    /// Commutation classes of R(n+1).
    Classes {
        #[arg(long)]
        n: usize,
        /// Override the default enumeration rank cap of 5.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Classification table: one row per commutation class.
    Table {
        #[arg(long)]
        n: usize,
        /// Keep one class per involution pair.
        #[arg(long)]
        mod_involution: bool,
        /// Override the default enumeration rank cap of 5.
        #[arg(long)]
        cap: Option<usize>,
    },
}

fn word_arg(s: &str) -> Result<ReducedWord, String> {
    ReducedWord::parse(s).map_err(|e| e.to_string())
}

fn coords_arg(s: &str) -> Result<Coords, String> {
    match s {
        "t" => Ok(Coords::T),
        "m" => Ok(Coords::M),
        other => Err(format!("bad coords {other:?}, expected t or m")),
    }
}

fn run(cli: &Cli) -> Result<String, String> {
    match &cli.command {
        Command::Paths { word } => {
            let word = word_arg(word)?;
            let diagram = WiringDiagram::build(&word);
            let paths = enumerate_rigorous_paths(&diagram);
            let items: Vec<Value> = paths
                .iter()
                .map(|p| {
                    let canonical = (1..=word.rank()).any(|k| {
                        stringpoly::wiring::canonical_d_new_path(&diagram, &paths, k)
                            .map(|c| std::ptr::eq(c, p))
                            .unwrap_or(false)
                    });
                    json!({
                        "path": p.expression(),
                        "source": p.source,
                        "w_m": p.w_m,
                        "w_t": p.w_t,
                        "max_peak": p.max_peak,
                        "is_D_new": p.is_new(&diagram, Bullet::D),
                        "is_A_new": p.is_new(&diagram, Bullet::A),
                        "is_canonical": canonical,
                    })
                })
                .collect();
            if cli.text {
                Ok(paths.iter().map(|p| p.expression()).collect::<Vec<_>>().join("\n"))
            } else {
                Ok(serde_json::to_string_pretty(&json!({ "word": word.to_string(), "count": paths.len(), "paths": items })).unwrap())
            }
        }
        Command::Polytope { word, lambda, coords, vertices } => {
            let word = word_arg(word)?;
            let lambda = WeightVector::parse(lambda).map_err(|e| e.to_string())?;
            let coords = coords_arg(coords)?;
            let p = polytope::string_polytope(&word, &lambda, coords).map_err(|e| e.to_string())?;
            let mut obj = serde_json::to_value(&p).unwrap();
            if *vertices {
                let vs = polytope::vertices(&p).map_err(|e| e.to_string())?;
                obj["vertices"] = Value::Array(
                    vs.vertices
                        .iter()
                        .map(|v| Value::Array(v.iter().map(|c| Value::String(c.to_string())).collect()))
                        .collect(),
                );
                obj["integral"] = Value::Bool(vs.integral);
            }
            Ok(serde_json::to_string_pretty(&obj).unwrap())
        }
        Command::Index { word, delta } => {
            let word = word_arg(word)?;
            let delta = DeltaSequence::parse(delta).map_err(|e| e.to_string())?;
            let index = moves::delta_index(&word, &delta).map_err(|e| e.to_string())?;
            let as_string = index.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            Ok(serde_json::to_string_pretty(&json!({
                "word": word.to_string(),
                "delta": delta.to_string(),
                "index": as_string,
                "entries": index,
            }))
            .unwrap())
        }
        Command::Small { word } => {
            let word = word_arg(word)?;
            let witness = moves::has_small_indices(&word);
            Ok(serde_json::to_string_pretty(&json!({
                "word": word.to_string(),
                "small": witness.is_some(),
                "witness": witness.map(|w| json!({"delta": w.delta.to_string(), "k": w.k})),
            }))
            .unwrap())
        }
        Command::Bott { word } => {
            let word = word_arg(word)?;
            let p = resolution::Pipeline::new(&word).map_err(|e| e.to_string())?;
            Ok(serde_json::to_string_pretty(&json!({
                "word": word.to_string(),
                "normalized_word": p.word.to_string(),
                "involuted": p.involuted,
                "v_columns": p.data.v_cols,
                "w_columns": p.data.w_cols,
            }))
            .unwrap())
        }
        Command::Resolve { word, lambda } => {
            let word = word_arg(word)?;
            let lambda = match lambda {
                Some(s) => WeightVector::parse(s).map_err(|e| e.to_string())?,
                None => WeightVector(vec![2; word.rank()]),
            };
            let verdict = resolution::verify_small_resolution(&word, &lambda).map_err(|e| e.to_string())?;
            Ok(serde_json::to_string_pretty(&verdict).unwrap())
        }
        Command::Potential { word } => {
            let word = word_arg(word)?;
            let pot = potential::disk_potential(&word).map_err(|e| e.to_string())?;
            if cli.text {
                Ok(potential::render_text(&pot))
            } else {
                Ok(potential::render_json(&pot))
            }
        }
        Command::Classes { n, cap } => {
            let cap = cap.unwrap_or(weyl::ENUMERATION_RANK_CAP);
            let classes = weyl::commutation_classes_capped(*n, cap).map_err(|e| e.to_string())?;
            let items: Vec<Value> = classes
                .iter()
                .map(|(rep, members)| {
                    json!({
                        "representative": rep.to_string(),
                        "members": members.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(serde_json::to_string_pretty(&json!({"n": n, "count": classes.len(), "classes": items})).unwrap())
        }
        Command::Table { n, mod_involution, cap } => {
            let rows = table_rows(*n, *mod_involution, cap.unwrap_or(weyl::ENUMERATION_RANK_CAP))?;
            if cli.text {
                let mut s = String::new();
                for r in &rows {
                    s.push_str(&format!(
                        "{:<22} {:<8} {:<12} {:<6} {}\n",
                        r["representative"].as_str().unwrap(),
                        r["delta"].as_str().unwrap_or("-"),
                        r["index"].to_string(),
                        if r["small"].as_bool().unwrap() { "yes" } else { "no" },
                        r["gp_count"]
                    ));
                }
                Ok(s)
            } else {
                Ok(rows.iter().map(|r| serde_json::to_string(r).unwrap()).collect::<Vec<_>>().join("\n"))
            }
        }
    }
}

fn table_rows(n: usize, mod_involution: bool, cap: usize) -> Result<Vec<Value>, String> {
    let classes = weyl::commutation_classes_capped(n, cap).map_err(|e| e.to_string())?;
    let mut reps: Vec<ReducedWord> = classes.iter().map(|(r, _)| r.clone()).collect();
    if mod_involution {
        let mut keep = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for r in reps {
            let mirror = r.involution().class_canonical();
            let key = std::cmp::min(r.clone(), mirror);
            if seen.insert(key) {
                keep.push(r);
            }
        }
        reps = keep;
    }
    Ok(reps
        .iter()
        .map(|rep| {
            let witness = moves::has_small_indices(rep);
            let gp = enumerate_rigorous_paths(&WiringDiagram::build(rep)).len();
            let (delta, index) = match &witness {
                Some(w) => {
                    let mut idx = vec![0; n];
                    idx[n - 1] = w.k;
                    (Some(w.delta.to_string()), idx)
                }
                None => (None, Vec::new()),
            };
            json!({
                "representative": rep.to_string(),
                "delta": delta,
                "index": index,
                "small": witness.is_some(),
                "gp_count": gp,
            })
        })
        .collect())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| run(&cli));
    let result = match outcome {
        Ok(r) => r,
        Err(_) => {
            eprintln!("{}", json!({"error": "internal invariant breach"}));
            return ExitCode::from(2);
        }
    };
    match result {
        Ok(output) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, output + "\n") {
                        eprintln!("{}", json!({"error": e.to_string()}));
                        return ExitCode::from(1);
                    }
                }
                None => {
                    let mut stdout = std::io::stdout().lock();
                    if writeln!(stdout, "{output}").is_err() {
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(message) => {
            eprintln!("{}", json!({ "error": message }));
            ExitCode::from(1)
        }
    }
}
