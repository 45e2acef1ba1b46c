//! On-disk cache of group enumerations. Character tables are always
//! recomputed; only the (slow) closure of the generators is stored.

use std::path::{Path, PathBuf};

use charvar::grouporacle::{make_field, CliffordSetting, Fixture, GroupTable, Label, Matrix};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{CliError, Context};

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    p: u32,
    k: u32,
    dim: usize,
    moduli: [u32; 2],
    generators: Vec<u32>,
    elements: Vec<Matrix>,
    labels: Vec<Label>,
}

/// sha256 of the field, dimension, quotient and labelled generators.
pub fn key(fx: &Fixture) -> String {
    let mut h = Sha256::new();
    h.update(format!("field {} {}\ndim {}\nquotient {} {}\n", fx.p, fx.k, fx.dim, fx.moduli[0], fx.moduli[1]));
    for (m, [la, lb]) in &fx.generators {
        let entries: Vec<String> = m.iter().map(u32::to_string).collect();
        h.update(format!("gen {la} {lb} : {}\n", entries.join(" ")));
    }
    hex::encode(h.finalize())
}

fn path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("group-{key}.json"))
}

fn io_err(what: &str, p: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("cache: cannot {what} {}: {e}", p.display()))
}

fn load(dir: &Path, fx: &Fixture, key: &str, ctx: &Context) -> Result<Option<CliffordSetting>, CliError> {
    let p = path(dir, key);
    let Ok(text) = std::fs::read_to_string(&p) else { return Ok(None) };
    // a stale or corrupt file is ignored and rewritten
    let Ok(entry) = serde_json::from_str::<Entry>(&text) else { return Ok(None) };
    if entry.key != key || entry.p != fx.p || entry.k != fx.k || entry.dim != fx.dim || entry.moduli != fx.moduli {
        return Ok(None);
    }
    if entry.elements.len() > ctx.caps.max_group_order {
        return Err(CliError::Cap(format!("cached group has order {}", entry.elements.len())));
    }
    let field = make_field(entry.p, entry.k)?;
    let Ok(g) = GroupTable::from_enumeration(&field, entry.dim, entry.elements, entry.generators) else {
        return Ok(None);
    };
    Ok(Some(CliffordSetting::new(g, entry.labels, entry.moduli, ctx.caps)?))
}

fn store(dir: &Path, fx: &Fixture, key: &str, s: &CliffordSetting) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err("create", dir, e))?;
    let g = s.group();
    let entry = Entry {
        key: key.to_string(),
        p: fx.p,
        k: fx.k,
        dim: fx.dim,
        moduli: fx.moduli,
        generators: g.generators().to_vec(),
        elements: g.elements().to_vec(),
        labels: (0..g.order() as u32).map(|x| s.label(x)).collect(),
    };
    let text = serde_json::to_string(&entry).map_err(|e| CliError::Failure(e.to_string()))?;
    let target = path(dir, key);
    let tmp = target.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, text).map_err(|e| io_err("write", &tmp, e))?;
    std::fs::rename(&tmp, &target).map_err(|e| io_err("write", &target, e))
}

/// The fixture's setting, from the cache when one is configured.
pub fn setting(fx: &Fixture, ctx: &Context) -> Result<(CliffordSetting, bool), CliError> {
    let Some(dir) = &ctx.cache else { return Ok((fx.setting(ctx.caps)?, false)) };
    let key = key(fx);
    if let Some(s) = load(dir, fx, &key, ctx)? {
        return Ok((s, true));
    }
    let s = fx.setting(ctx.caps)?;
    store(dir, fx, &key, &s)?;
    Ok((s, false))
}
