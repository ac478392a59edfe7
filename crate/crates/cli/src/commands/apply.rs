use super::{domain_error, load_point, load_tree, save_regular_tree, Ctx};
use clap::{Args, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use wadge_core::ops;

#[derive(Clone, Copy, ValueEnum)]
pub enum OpName {
    Lim,
    Limdelta,
    Isfinite,
    Par,
    Td,
    Linearize,
    Indlabel,
}

#[derive(Args)]
pub struct ApplyArgs {
    /// Operator to apply.
    #[arg(value_enum)]
    op: OpName,
    /// Input point file (lim, limdelta, isfinite, par) or tree file (td,
    /// linearize, indlabel).
    #[arg(long = "in")]
    input: PathBuf,
    /// Columnwise operator for `par`.
    #[arg(long, default_value = "isfinite")]
    col_op: String,
}

pub fn run(ctx: &Ctx, args: ApplyArgs) -> Result<ExitCode, String> {
    match args.op {
        OpName::Lim | OpName::Limdelta => {
            let p = load_point(&args.input)?;
            let r = match args.op {
                OpName::Lim => ops::lim_eval(&p),
                _ => ops::lim_delta_eval(&p),
            };
            match r {
                Err(e) => Ok(domain_error(e)),
                Ok(q) => {
                    let text = q
                        .to_json()
                        .map(|j| format!("{j}\n"))
                        .unwrap_or_else(|_| format!("prefix: {:?}\n", q.prefix(ctx.depth)));
                    ctx.emit(&text)?;
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        OpName::Isfinite => {
            let p = load_point(&args.input)?;
            match ops::is_finite_eval(&p) {
                Err(e) => Ok(domain_error(e)),
                Ok(bit) => {
                    ctx.emit(&format!("{bit}\n"))?;
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        OpName::Par => {
            let p = load_point(&args.input)?;
            let op = match args.col_op.as_str() {
                "isfinite" => ops::ColumnOp::IsFinite,
                "identity" => ops::ColumnOp::Identity,
                "lim" => ops::ColumnOp::Lim,
                "limdelta" => ops::ColumnOp::LimDelta,
                other => return Err(format!("unknown columnwise operator: {other}")),
            };
            match ops::parallel_apply(op, &p) {
                Err(e) => Ok(domain_error(e)),
                Ok(q) => {
                    let text = q
                        .to_json()
                        .map(|j| format!("{j}\n"))
                        .unwrap_or_else(|_| format!("prefix: {:?}\n", q.prefix(ctx.depth)));
                    ctx.emit(&text)?;
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        OpName::Td => {
            let t = load_tree(&args.input)?.to_regular();
            let d = ops::prune_derivative(&t);
            match &ctx.out {
                Some(path) => save_regular_tree(path, &d)?,
                None => println!(
                    "{}",
                    serde_json::to_string_pretty(&d.to_doc()).expect("tree doc serializes")
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        OpName::Linearize => {
            let t = load_tree(&args.input)?.to_regular();
            match ops::linearize(&t) {
                Err(e) => Ok(domain_error(e)),
                Ok(l) => {
                    match &ctx.out {
                        Some(path) => save_regular_tree(path, &l)?,
                        None => println!(
                            "{}",
                            serde_json::to_string_pretty(&l.to_doc())
                                .expect("tree doc serializes")
                        ),
                    }
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        OpName::Indlabel => {
            let t = load_tree(&args.input)?.to_regular();
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
