//! CPLEX LP text export. Variables `X{p}` are binary and 0-based; the
//! constraint for block `k` is named `e{k}`. Sections appear in the order
//! objective, constraints, bounds, binaries, end.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HittingInstance;
use crate::error::{Error, Result};

const TERMS_PER_LINE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpMode {
    /// Every block sums to exactly 1; constant objective.
    Exact,
    /// Every block sums to at most 1; maximize the number of points.
    Packing,
}

fn push_sum(out: &mut String, vars: impl Iterator<Item = u32>) {
    for (i, p) in vars.enumerate() {
        if i > 0 {
            out.push_str(if i % TERMS_PER_LINE == 0 {
                "\n   + "
            } else {
                " + "
            });
        }
        write!(out, "X{p}").expect("string write");
    }
}

/// The LP model as text.
pub fn write_lp(inst: &HittingInstance, forced: &[u32], mode: LpMode) -> Result<String> {
    inst.check_forced(forced)?;
    let n = inst.universe_size() as u32;
    let mut out = String::new();
    writeln!(out, "\\ {}", inst.origin().replace('\n', " ")).expect("string write");
    match mode {
        LpMode::Exact => out.push_str("Minimize\n obj: 0 X0\n"),
        LpMode::Packing => {
            out.push_str("Maximize\n obj: ");
            push_sum(&mut out, 0..n);
            out.push('\n');
        }
    }
    out.push_str("Subject To\n");
    let rel = match mode {
        LpMode::Exact => "=",
        LpMode::Packing => "<=",
    };
    for (k, b) in inst.blocks().iter().enumerate() {
        write!(out, " e{k}: ").expect("string write");
        push_sum(&mut out, b.iter().copied());
        writeln!(out, " {rel} 1").expect("string write");
    }
    out.push_str("Bounds\n");
    let mut fixed = forced.to_vec();
    fixed.sort_unstable();
    for p in fixed {
        writeln!(out, " X{p} = 1").expect("string write");
    }
    out.push_str("Binary\n ");
    for p in 0..n {
        if p > 0 {
            out.push_str(if (p as usize).is_multiple_of(TERMS_PER_LINE) {
                "\n "
            } else {
                " "
            });
        }
        write!(out, "X{p}").expect("string write");
    }
    out.push_str("\nEnd\n");
    Ok(out)
}

pub fn export_lp(
    inst: &HittingInstance,
    forced: &[u32],
    mode: LpMode,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let text = write_lp(inst, forced, mode)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_single_block() {
        let inst = HittingInstance::new(2, vec![vec![0, 1]], "tiny").unwrap();
        let text = write_lp(&inst, &[], LpMode::Exact).unwrap();
        assert!(text.contains(" e0: X0 + X1 = 1\n"), "{text}");
        let order: Vec<usize> = ["Minimize", "Subject To", "Bounds", "Binary", "End"]
            .iter()
            .map(|h| text.find(h).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn packing_with_forced() {
        let inst = HittingInstance::new(3, vec![vec![0, 1], vec![1, 2]], "x").unwrap();
        let text = write_lp(&inst, &[2], LpMode::Packing).unwrap();
        assert!(text.contains("Maximize\n obj: X0 + X1 + X2\n"));
        assert!(text.contains(" e1: X1 + X2 <= 1\n"));
        assert!(text.contains("Bounds\n X2 = 1\n"));
        let dir = tempfile::tempdir().unwrap();
        export_lp(&inst, &[], LpMode::Exact, dir.path().join("m.lp")).unwrap();
        assert!(export_lp(&inst, &[], LpMode::Exact, dir.path().join("no/such/m.lp")).is_err());
    }
}
