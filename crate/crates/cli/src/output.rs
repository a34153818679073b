use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use lcu_prep::grid::{unravel, GridSpec};
use lcu_prep::Complex64;
use serde::Serialize;

use crate::config::ConfigError;

pub struct OutDir(PathBuf);

impl OutDir {
    pub fn create(dir: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self(dir.to_path_buf()))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    pub fn write_json(&self, name: &str, value: &impl Serialize) -> anyhow::Result<PathBuf> {
        let p = self.path(name);
        fs::write(&p, serde_json::to_string_pretty(value)? + "\n").with_context(|| format!("writing {}", p.display()))?;
        log::info!("wrote {}", p.display());
        Ok(p)
    }

    pub fn write_text(&self, name: &str, text: &str) -> anyhow::Result<PathBuf> {
        let p = self.path(name);
        fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
        log::info!("wrote {}", p.display());
        Ok(p)
    }

    pub fn csv(&self, name: &str) -> anyhow::Result<csv::Writer<fs::File>> {
        let p = self.path(name);
        log::info!("writing {}", p.display());
        csv::Writer::from_path(&p).with_context(|| format!("writing {}", p.display()))
    }
}

fn grid_header(dims: usize) -> Vec<String> {
    (0..dims).map(|d| format!("i{d}")).chain((0..dims).map(|d| format!("x{d}"))).collect()
}

fn grid_fields(g: &GridSpec, flat: usize) -> Vec<String> {
    let idx = unravel(flat, &g.shape());
    idx.iter()
        .map(|i| i.to_string())
        .chain(g.point(flat).iter().map(|x| format!("{x:.17e}")))
        .collect()
}

/// Columns: i0.., x0.., re, im, prob.
pub fn write_amplitudes(out: &OutDir, name: &str, g: &GridSpec, amps: &[Complex64]) -> anyhow::Result<()> {
    let mut w = out.csv(name)?;
    let mut head = grid_header(g.dims());
    head.extend(["re", "im", "prob"].map(String::from));
    w.write_record(&head)?;
    for (i, a) in amps.iter().enumerate() {
        let mut row = grid_fields(g, i);
        row.extend([a.re, a.im, a.norm_sqr()].map(|v| format!("{v:.17e}")));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: i0.., x0.., count. Only nonzero counts are listed.
pub fn write_counts(out: &OutDir, name: &str, g: &GridSpec, counts: &BTreeMap<usize, u64>) -> anyhow::Result<()> {
    let mut w = out.csv(name)?;
    let mut head = grid_header(g.dims());
    head.push("count".into());
    w.write_record(&head)?;
    for (&i, &c) in counts {
        let mut row = grid_fields(g, i);
        row.push(c.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: i0.., x0.., then one column per named series.
pub fn write_grid_table(out: &OutDir, name: &str, g: &GridSpec, cols: &[(&str, &[f64])]) -> anyhow::Result<()> {
    let mut w = out.csv(name)?;
    let mut head = grid_header(g.dims());
    head.extend(cols.iter().map(|(n, _)| n.to_string()));
    w.write_record(&head)?;
    for i in 0..g.len() {
        let mut row = grid_fields(g, i);
        row.extend(cols.iter().map(|(_, v)| format!("{:.17e}", v[i])));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a counts CSV back into flat grid index → count, checking the
/// indices against the grid.
pub fn read_counts(path: &Path, g: &GridSpec) -> anyhow::Result<BTreeMap<usize, u64>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let dims = g.dims();
    let shape = g.shape();
    let head = r.headers()?.clone();
    let count_col = head
        .iter()
        .position(|h| h == "count")
        .ok_or_else(|| ConfigError(format!("{}: no `count` column", path.display())))?;
    let idx_cols: Vec<usize> = (0..dims)
        .map(|d| {
            head.iter()
                .position(|h| h == format!("i{d}"))
                .ok_or_else(|| ConfigError(format!("{}: no `i{d}` column", path.display())))
        })
        .collect::<Result<_, _>>()?;
    let mut counts = BTreeMap::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |c: usize| -> anyhow::Result<u64> {
            rec.get(c)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| ConfigError(format!("{}: bad value on data row {}", path.display(), line + 1)).into())
        };
        let mut flat = 0usize;
        for (d, &c) in idx_cols.iter().enumerate() {
            let i = parse(c)? as usize;
            if i >= shape[d] {
                return Err(ConfigError(format!("{}: index {i} outside axis {d} of size {}", path.display(), shape[d])).into());
            }
            flat = flat * shape[d] + i;
        }
        let c = parse(count_col)?;
        if c > 0 {
            *counts.entry(flat).or_insert(0) += c;
        }
    }
    Ok(counts)
}
