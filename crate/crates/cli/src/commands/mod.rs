pub mod apply;
pub mod play;
pub mod run;
pub mod tree;
pub mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use wadge_core::point::Point;
use wadge_core::trees::{FiniteTree, FiniteTreeDoc, RegularTree, RegularTreeDoc};

pub struct Ctx {
    pub seed: u64,
    pub depth: usize,
    pub samples: usize,
    pub out: Option<PathBuf>,
}

impl Ctx {
    /// Writes the primary result to `--out` or standard output.
    pub fn emit(&self, text: &str) -> Result<(), String> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

/// Exit with a domain-error diagnostic (status 2).
pub fn domain_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("domain error: {msg}");
    ExitCode::from(2)
}

pub enum TreeFile {
    Finite(FiniteTree),
    Regular(RegularTree),
}

impl TreeFile {
    pub fn to_regular(&self) -> RegularTree {
        match self {
            TreeFile::Finite(t) => t.to_regular(),
            TreeFile::Regular(t) => t.clone(),
        }
    }
}

/// Reads a tree document, accepting both the finite (`nodes`) and regular
/// (`vertices`/`edges`) forms.
pub fn load_tree(path: &Path) -> Result<TreeFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if value.get("nodes").is_some() {
        let doc: FiniteTreeDoc =
            serde_json::from_value(value).map_err(|e| format!("{}: {e}", path.display()))?;
        let t = FiniteTree::from_doc(&doc).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(TreeFile::Finite(t))
    } else if value.get("vertices").is_some() {
        let doc: RegularTreeDoc =
            serde_json::from_value(value).map_err(|e| format!("{}: {e}", path.display()))?;
        let t = RegularTree::from_doc(&doc).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(TreeFile::Regular(t))
    } else {
        Err(format!(
            "{}: neither a finite tree (nodes) nor a regular tree (vertices/edges)",
            path.display()
        ))
    }
}

pub fn save_regular_tree(path: &Path, t: &RegularTree) -> Result<(), String> {
    let text = serde_json::to_string_pretty(&t.to_doc()).expect("tree doc serializes");
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn load_point(path: &Path) -> Result<Point, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Point::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}
