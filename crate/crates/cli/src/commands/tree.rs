use super::{domain_error, load_point, load_tree, save_regular_tree, Ctx, TreeFile};
use clap::{Args, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use wadge_core::ops;
use wadge_core::trees::{
    bisimilar_exact, decode_prefix, encode_tree, encode_tree_seeded, tree_props, CanonicalForm,
};
use wadge_core::words::Word;

#[derive(Args)]
pub struct TreeArgs {
    #[command(subcommand)]
    cmd: TreeCmd,
}

#[derive(Subcommand)]
enum TreeCmd {
    /// Encode a tree file as a point document.
    Encode {
        #[arg(long = "in")]
        input: PathBuf,
        /// Representative seed for regular trees.
        #[arg(long, default_value_t = 0)]
        rep_seed: u64,
    },
    /// Decode a code prefix into settled nodes and absent slots.
    Decode {
        /// A JSON array of symbols, e.g. "[0,4,1]".
        #[arg(long)]
        prefix: Option<String>,
        /// Alternatively, a point file whose prefix is decoded.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Prefix length when decoding from a point file.
        #[arg(long, default_value_t = 64)]
        len: usize,
    },
    /// Are two trees bisimilar? Compares exactly with --exact, else to the
    /// global --depth.
    Bisim {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        exact: bool,
    },
    /// Structural facts: linearity, prunedness, properness, height.
    Props {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The pruning derivative.
    Derive {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The unique proper pruned subtree of a proper tree.
    Linearize {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The star of a tree: labels shifted up, spine adjoined.
    Star {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The induced label along the least ultimately periodic branch.
    Indlabel {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

pub fn run(ctx: &Ctx, args: TreeArgs) -> Result<ExitCode, String> {
    match args.cmd {
        TreeCmd::Encode { input, rep_seed } => {
            let point = match load_tree(&input)? {
                TreeFile::Finite(t) => encode_tree(&t),
                TreeFile::Regular(t) => match encode_tree_seeded(&t, rep_seed) {
                    Ok(p) => p,
                    Err(e) => return Ok(domain_error(e)),
                },
            };
            ctx.emit(&format!("{}\n", point.to_json().expect("tree codes serialize")))?;
            Ok(ExitCode::SUCCESS)
        }
        TreeCmd::Decode { prefix, input, len } => {
            let word: Word = match (prefix, input) {
                (Some(text), _) => {
                    let symbols: Vec<u64> =
                        serde_json::from_str(&text).map_err(|e| format!("prefix: {e}"))?;
                    Word(symbols)
                }
                (None, Some(path)) => load_point(&path)?.prefix(len),
                (None, None) => return Err("decode needs --prefix or --in".into()),
            };
            match decode_prefix(&word) {
                Err(e) => Ok(domain_error(e)),
                Ok(pt) => {
                    let mut out = String::new();
                    out.push_str(&format!("horizon: {}\n", pt.horizon));
                    out.push_str(&format!(
                        "nonempty: {}\n",
                        if pt.root_known_nonempty { "yes" } else { "unknown" }
                    ));
                    for (path, label) in &pt.present {
                        out.push_str(&format!("present {path:?} label {label}\n"));
                    }
                    for path in &pt.absent {
                        out.push_str(&format!("absent {path:?}\n"));
                    }
                    ctx.emit(&out)?;
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        TreeCmd::Bisim { a, b, exact } => {
            let ta = load_tree(&a)?.to_regular();
            let tb = load_tree(&b)?.to_regular();
            let same = if exact {
                bisimilar_exact(&ta, &tb)
            } else {
                CanonicalForm::of_regular(&ta, ctx.depth as u64)
                    == CanonicalForm::of_regular(&tb, ctx.depth as u64)
            };
            ctx.emit(if same { "BISIMILAR\n" } else { "NOT BISIMILAR\n" })?;
            Ok(ExitCode::SUCCESS)
        }
        TreeCmd::Props { input } => {
            let t = load_tree(&input)?.to_regular();
            let p = tree_props(&t);
            let height = match p.height {
                None => "infinite".to_string(),
                Some(h) => h.to_string(),
            };
            ctx.emit(&format!(
                "linear: {}\npruned: {}\nproper: {}\nfinitely-branching: {}\nheight: {}\n",
                p.is_linear, p.is_pruned, p.is_proper, p.is_finitely_branching, height
            ))?;
            Ok(ExitCode::SUCCESS)
        }
        TreeCmd::Derive { input } => {
            let t = load_tree(&input)?.to_regular();
            let d = ops::prune_derivative(&t);
            emit_tree(ctx, &d)
        }
        TreeCmd::Linearize { input } => {
            let t = load_tree(&input)?.to_regular();
            match ops::linearize(&t) {
                Err(e) => Ok(domain_error(e)),
                Ok(l) => emit_tree(ctx, &l),
            }
        }
        TreeCmd::Star { input } => {
            let t = load_tree(&input)?.to_regular();
            emit_tree(ctx, &wadge_core::trees::star_tree(&t))
        }
        TreeCmd::Indlabel { input } => {
            let t = load_tree(&input)?.to_regular();
            match ops::ind_label(&t) {
                Err(e) => Ok(domain_error(e)),
                Ok(p) => {
                    ctx.emit(&format!("{}\n", p.to_json().expect("flat points serialize")))?;
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
    }
}

fn emit_tree(ctx: &Ctx, t: &wadge_core::trees::RegularTree) -> Result<ExitCode, String> {
    match &ctx.out {
        Some(path) => save_regular_tree(path, t)?,
        None => {
            let text = serde_json::to_string_pretty(&t.to_doc()).expect("tree doc serializes");
            println!("{text}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
